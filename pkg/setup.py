from setuptools import setup

setup(packages=['s2shock', 's2shock.utils'])
