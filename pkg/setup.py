"""The setup script for installing the package."""
from setuptools import setup, find_packages


# read the contents of the README
with open('README.md') as README_md:
    README = README_md.read()


setup(
    name='base_pc',
    version='1.0.0',
    description='Basis-adaptive sample-efficient polynomial chaos surrogates',
    long_description=README,
    long_description_content_type='text/markdown',
    keywords=' '.join([
        'Polynomial-Chaos',
        'Uncertainty-Quantification',
        'Compressive-Sampling',
        'Surrogate-Model',
        'Basis-Pursuit-Denoising',
    ]),
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Developers',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: MacOS :: MacOS X',
        'Operating System :: POSIX :: Linux',
        'Operating System :: Microsoft :: Windows',
        'Programming Language :: Python :: 3 :: Only',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    license='MIT',
    python_requires='>=3.8',
    packages=find_packages(exclude=['tests', '*.tests', '*.tests.*']),
    install_requires=[
        'numpy>=1.20.0',
        'scipy>=1.6.0',
        'pandas>=1.1.0',
        'scikit-learn>=0.24.0',
        'tqdm>=4.19.5',
    ],
    entry_points={
        'console_scripts': [
            'base_pc = base_pc._app.cli:main',
        ],
    },
)
