# Sphinx configuration for unit-interval-metastability.
import os
import sys

sys.path.insert(0, os.path.abspath("../src/"))

project = "unit-interval-metastability"
copyright = "2023, Kota Yamaguchi"
author = "Kota Yamaguchi"

version = "0.1.0"
release = version

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.coverage",
    "sphinx.ext.mathjax",
    "sphinx_rtd_theme",
]
autodoc_member_order = "bysource"

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"
language = None
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
pygments_style = None

html_theme = "sphinx_rtd_theme"
htmlhelp_basename = "unit-interval-metastabilitydoc"

latex_documents = [
    (
        master_doc,
        "unit-interval-metastability.tex",
        "unit-interval-metastability Documentation",
        author,
        "manual",
    ),
]

man_pages = [
    (
        master_doc,
        "metastability",
        "unit-interval-metastability Documentation",
        [author],
        1,
    )
]
