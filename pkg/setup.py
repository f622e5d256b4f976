from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

# Minimal dependencies if requirements.txt is not shipped
basic_requirements = [
    "numpy>=1.25",
    "scipy>=1.10",
    "cvxpy>=1.4",
    "clarabel>=0.6",
    "pydantic>=2.7.0",
    "pydantic-settings>=2.0.0",
    "python-dotenv>=1.0.0",
    "sqlalchemy>=2.0.0",
    "typer>=0.9.0",
    "rich>=13.3.5",
    "tomli>=2.0.0; python_version < '3.11'",
]

try:
    with open("requirements.txt", "r", encoding="utf-8") as f:
        requirements = [
            line.strip() for line in f.read().splitlines()
            if line.strip() and not line.startswith("#") and not line.startswith("pytest")
        ]
except FileNotFoundError:
    requirements = basic_requirements

setup(
    name="aether",
    version="0.1.0",
    description="Aether: transmit power minimization for IRS-assisted SWIPT-NOMA downlinks",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering",
    ],
    python_requires=">=3.10",
    install_requires=requirements,
    extras_require={"dev": ["pytest>=7.0"]},
    entry_points={
        "console_scripts": [
            "aether=aether.cli.main:app",
        ],
    },
    include_package_data=True,
)
