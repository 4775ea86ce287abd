from setuptools import setup, find_packages

setup(
    name='ldpc-lattice',
    version='0.1.0',
    packages=find_packages(exclude=['tests', 'examples', 'examples.*']),
    install_requires=[
        'numpy>=1.24',
        'scipy>=1.11',
        'galois>=0.3',
        'sympy>=1.12',
        'PyQt6>=6.4.0',
    ],
    entry_points={
        'console_scripts': [
            'ldl=scripts.main:main',
        ],
    },
    description='Constructs LDPC lattices (Construction A and D\'), decodes them with min-sum and '
                'sum-product message passing, and measures error rates by seeded Monte Carlo simulation.',
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    classifiers=[
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
    ],
    python_requires='>=3.9',
)
