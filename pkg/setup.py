"""Setup file for StarRisNoma"""

from setuptools import setup

with open("README.md", "r") as fh:
    long_description = fh.read()

PACKAGE_NAMES = ['StarRisNoma']
KEYWORDS = [
    'reconfigurable intelligent surface', 'STAR-RIS', 'NOMA',
    'channel estimation', 'hardware impairments', 'Monte Carlo']
SHORT_DESCRIPTION = (
    'Monte Carlo and closed-form analysis of STAR-RIS assisted NOMA uplinks')

CLASSIFIERS = [
    'Development Status :: 4 - Beta',
    'Intended Audience :: Science/Research',
    'License :: OSI Approved :: MIT License',
    'Programming Language :: Python :: 3',
    'Operating System :: OS Independent',
    'Topic :: Scientific/Engineering']

PACKAGE_REQUIREMENTS = ['numpy', 'pandas', 'scipy', 'pydantic>=2']
TEST_REQUIREMENTS = ['pytest', 'pytest-timeout']

if __name__ == '__main__':
    setup(name='StarRisNoma', version='1.0.0',
          python_requires='>=3.10',
          description=SHORT_DESCRIPTION,
          long_description=long_description,
          long_description_content_type="text/markdown",
          license='MIT',
          packages=PACKAGE_NAMES, scripts=[], keywords=KEYWORDS,
          classifiers=CLASSIFIERS, include_package_data=True, zip_safe=False,
          install_requires=PACKAGE_REQUIREMENTS,
          tests_require=TEST_REQUIREMENTS,
          extras_require={'test': TEST_REQUIREMENTS},
          entry_points={
              'console_scripts': ['star-noma=StarRisNoma.cli:main']})
