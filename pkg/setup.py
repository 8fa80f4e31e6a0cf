from setuptools import setup, find_packages
import re

with open("README.md", "r") as f:
    long_description = f.read()

with open('QSep/__init__.py') as f:
    version = re.search(r'^__version__\s*=\s*[\'"]([^\'"]*)[\'"]', f.read(), re.MULTILINE).group(1) or ''

if not version:
    raise RuntimeError('No Version Found.')


def parse_requirements(filename):
    """Load requirements from a pip requirements file."""
    line_iter = (line.strip() for line in open(filename))
    return [line for line in line_iter if line and not line.startswith("#")]


setup(
    name='QSep',
    version=version,
    packages=find_packages(exclude=("tests", "tests.*")),
    package_data={"QSep": ["schemas/*.json"]},
    install_requires=parse_requirements("requirements.txt"),
    extras_require={"test": ["pytest>=6.0", "jsonschema>=3.2"]},
    entry_points={"console_scripts": ["qsep=QSep.cli:main"]},
    license='MIT License',
    author='MujyKun',
    author_email='mujy@irenebot.com',
    description='Separability criteria for two-qubit states: angular averages, PPT, diagonal sums and CHSH',
    classifiers=[
        "Development Status :: 4 - Beta",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    long_description=long_description,
    long_description_content_type="text/markdown",
    python_requires='>=3.7',

)
