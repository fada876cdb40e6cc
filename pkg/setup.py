from setuptools import find_packages, setup

setup(
    name="hybridflow",
    version="0.1.0",
    description="Hamiltonian dynamics of coupled quantum-classical systems",
    author="hybridflow team",
    packages=find_packages(include=["hybridflow", "hybridflow.*"]),
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "sympy>=1.12",
        "pandas>=2.0.0",
        "pyyaml>=6.0",
        "joblib>=1.3.0",
    ],
    entry_points={"console_scripts": ["hybridflow=hybridflow.cli:main"]},
)
