from setuptools import setup, find_packages

with open("requirements.txt") as f:
	install_requires = [line for line in f.read().strip().split("\n") if line and not line.startswith("#")]

# get version from __version__ variable in da_sfft/__init__.py
from da_sfft import __version__ as version

setup(
	name="da_sfft",
	version=version,
	description="Desk-scale blind face restoration under heavy rain",
	author="AtlasAero GmbH",
	author_email="info@atlasaero.eu",
	packages=find_packages(exclude=["examples", "examples.*"]),
	zip_safe=False,
	include_package_data=True,
	install_requires=install_requires,
	entry_points={"console_scripts": ["da_sfft = da_sfft.cli:main"]}
)
