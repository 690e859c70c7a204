"""Free divisors: logarithmic derivations, Saito bases, Jordan decompositions of
singular derivations and the trace test for the logarithmic comparison theorem."""

__version__ = "0.1.0"
