# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.
#
# This file only contains a selection of the most common options. For a full
# list see the documentation:
# http://www.sphinx-doc.org/en/master/config

# -- Path setup --------------------------------------------------------------

import os
import sys
sys.path.insert(0, os.path.abspath('..'))

from StarRisNoma import __version__  # noqa: E402


# -- Project information -----------------------------------------------------

project = u'StarRisNoma'
copyright = u'2024, the StarRisNoma developers'
author = u'the StarRisNoma developers'

# The short X.Y version
version = '.'.join(__version__.split('.')[:2])
# The full version, including alpha/beta/rc tags
release = __version__


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.imgmath',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
language = 'en'
exclude_patterns = [u'_build', 'Thumbs.db', '.DS_Store']
pygments_style = None

# The rate and estimation modules document their formulas in plain text
autodoc_member_order = 'bysource'


# -- Options for HTML output -------------------------------------------------

html_theme = 'alabaster'
html_static_path = []
htmlhelp_basename = 'StarRisNomadoc'


# -- Options for LaTeX output ------------------------------------------------

latex_documents = [
    (master_doc, 'StarRisNoma.tex', u'StarRisNoma Documentation',
     author, 'manual'),
]


# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, 'starrisnoma', u'StarRisNoma Documentation',
     [author], 1)
]
