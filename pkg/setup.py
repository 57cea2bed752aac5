from setuptools import find_packages, setup


with open("requirements.txt") as f:
    requirements = [line.strip() for line in f if line.strip() and not line.startswith("pytest")]

setup(
    name="casimir-piston",
    version="0.1.0",
    description="Cutoff-regularized Casimir piston energies with and without a weak dielectric",
    packages=find_packages(include=["casimir_piston", "casimir_piston.*"]),
    python_requires=">=3.8",
    install_requires=requirements,
    extras_require={"test": ["pytest>=7.4"]},
    entry_points={"console_scripts": ["casimir-piston=casimir_piston.cli:run"]},
)
