"""
Setup script for the HUOSP miner
"""

from setuptools import setup

setup(
    name="huosp-miner",
    version="1.0.0",
    description="High utility-occupancy sequential pattern mining (SUMU) with a brute-force oracle",
    author="Your Name",
    py_modules=[
        "main",
        "errors",
        "sequence_database",
        "occupancy",
        "uol_chain",
        "sumu_miner",
        "oracle",
        "qdb_format",
        "data_generator",
    ],
    install_requires=[
        "python-dotenv>=1.0.0",
        "psutil>=5.9.0",
        "numpy>=1.24.0",
        "pandas>=2.0.0",
    ],
    extras_require={
        "test": ["pytest>=7.4.0", "hypothesis>=6.80.0"],
    },
    entry_points={
        'console_scripts': [
            'huosp=main:main',
        ],
    },
    python_requires='>=3.10',
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Information Analysis",
    ],
)
