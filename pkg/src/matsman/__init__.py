__version__ = "0.1.0"
__author__ = "ExilProductions"
__email__ = "exil.productions.business@gmail.com"
