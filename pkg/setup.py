import sys

from setuptools import setup


def get_version(filename):
    import ast
    version = None
    with open(filename) as f:
        for line in f:
            if line.startswith('__version__'):
                version = ast.parse(line).body[0].value.value
                break
        else:
            raise ValueError('No version found in %r.' % filename)
    if version is None:
        raise ValueError(filename)
    return version


if sys.version_info < (3, 10):
    msg = 'hsk works with Python 3.10 and later.\nDetected %s.' % str(sys.version)
    sys.exit(msg)

lib_version = get_version(filename='include/hsk/__init__.py')

setup(
    name='hsk',
    packages=[
        'hsk',
        'hsk.cli',
        'hsk.cli.commands',
        'hsk.interpret',
        'hsk.neural',
        'hsk.utils'
    ],
    package_dir={
        'hsk': 'include/hsk'
    },
    package_data={
        "hsk": [
            "schemas/*/*.json",
        ],
    },
    version=lib_version,
    license='MIT',
    description='Hate-speech toolKit: multi-task bi-LSTM classifiers with max-pooling word '
                'attribution and t-SNE maps of the sentence space.',
    zip_safe=False,
    include_package_data=True,
    keywords=['hate speech', 'text classification', 'transfer learning', 'lstm', 't-sne'],
    install_requires=[
        'dacite',
        'jsonschema',
        'termcolor',
        'pyyaml',
        'mergedeep',
        'numpy',
        'scipy',
        'scikit-learn',
        'pandas>=1.5',
    ],
    extras_require={
        'tests': [
            'hypothesis',
        ],
    },
    scripts=[
        'include/hsk/bin/hsk'
    ],
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
    ],
)
