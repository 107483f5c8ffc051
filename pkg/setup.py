from setuptools import setup, find_packages
from pathlib import Path

# Read the README file to use as the long description for the package
long_description = (Path(__file__).parent / "README.md").read_text()

setup(
    # Name of the package
    name='radial-shoot',

    # Version of this release
    version='0.1.0',

    # Automatically find all packages in the current directory, leaving the tests out
    packages=find_packages(exclude=['tests', 'tests.*']),

    # Include additional files specified in MANIFEST.in
    include_package_data=True,

    # List of dependencies required to install and run the package
    install_requires=[
        'numpy>=1.24',  # arrays and Gauss-Legendre nodes
        'scipy>=1.10',  # Hermite splines, DOP853, brentq and quad
        'matplotlib>=3.7',  # SVG figures
    ],

    # Console command installed with the package
    entry_points={
        'console_scripts': [
            'radial-shoot=radial_shoot.cli:main',
        ],
    },

    # Specify the minimum Python version required
    python_requires='>=3.10',

    # Short description of the package
    description='A shooting-method solver for sign-changing radial bound states of semilinear elliptic equations.',

    # Long description of the package, read from the README file
    long_description=long_description,
    long_description_content_type='text/markdown',  # Specify the format of the long description

    # License under which the package is released
    license='MIT',

    # Platforms that the package can run on
    platforms='any',

    # Classifiers help users find your project by categorizing it
    classifiers=[
        'Development Status :: 3 - Alpha',  # Development status of the package
        'Intended Audience :: Science/Research',  # Intended audience for the package
        'License :: OSI Approved :: MIT License',  # License type
        'Natural Language :: English',  # Language of the package
        'Operating System :: OS Independent',  # OS compatibility
        'Programming Language :: Python',  # Programming language used
        'Programming Language :: Python :: 3',  # Specific Python versions supported
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Topic :: Scientific/Engineering :: Mathematics',  # Category of the package
    ],

    # Keywords to help users find the package
    keywords='shooting method radial solutions bound states ODE',
)
