from setuptools import setup, find_packages
import io

with io.open("README.md", "r", encoding="utf-8") as f:
    long_description = f.read()
setup(
    name='dmr',
    version='0.1.0',
    description='A prototype-based, explainable classifier with synthetic class balancing and a pairwise decision cascade.',
    long_description=long_description,
    long_description_content_type='text/markdown',
    include_package_data=True,
    packages=find_packages(exclude=['tests', 'docs', 'examples']),
    classifiers=[
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
    ],
    python_requires='>=3.9',
    install_requires=[
        'numpy>=1.22',
        'pandas>=1.0.0',
        'rich>=12.0',
    ],
    extras_require={
        'test': ['pytest>=7'],
    },
    entry_points={
        'console_scripts': [
            'dmr=dmr.cli:main',
        ],
    },
)
