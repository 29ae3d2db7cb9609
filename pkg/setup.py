#!/usr/bin/env python

import setuptools
from setuptools import setup

setup(name='gdcan',
      version='0.1',
      description='Online generalized deduplication compressor for CAN logs stored in MDF4.',
      packages=setuptools.find_packages(exclude=['test', 'test.*']),
      python_requires='>=3.10',
      install_requires=['numpy',
                        'pandas',
                        'tqdm',
                        'psutil',
                        'matplotlib'],
      extras_require={'test': ['pytest']},
      entry_points={'console_scripts': ['gdcan=gdcan.cli:main']},
     )
