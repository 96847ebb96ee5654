import setuptools
from pathlib import Path

long_description = (Path(__file__).parent / "README.md").read_text()

setuptools.setup(
    name="django-wordrep",
    description="Word-representability of graphs: semi-transitive orientations, refutation transcripts and K_m-K_n graphs",
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="MIT",
    packages=setuptools.find_packages(),
    include_package_data=True,
    package_data={"wordrep": ["data/MANIFEST", "data/cases.txt", "data/*/*"]},
    install_requires=["Django", "networkx>=2.6", "tqdm", "joblib>=1.3"],
    extras_require={"celery": ["celery"]},
    python_requires=">=3.10",
    entry_points={"console_scripts": ["wordrep=wordrep.__main__:main"]},
    classifiers=[
        "Framework :: Django",
        "Programming Language :: Python",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
