from setuptools import find_packages, setup

setup(
    name="reprosamples",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"reprosamples": ["data/*.csv"]},
    entry_points={
        'console_scripts': [
            'reprosamples=reprosamples.run:main',
        ],
    },
    python_requires='>=3.10',
    description="Repro-samples inference for models and coefficients in sparse linear regression",
    long_description=open('README.md').read(),
    long_description_content_type="text/markdown",
)
