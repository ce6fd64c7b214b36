"""mtzeta: numerical toolkit for the generalized Mordell-Tornheim zeta
function Theta(r,s,t,x) = sum_{n,m>=1} n^{-r} m^{-s} (n+m x)^{-t}."""

__version__ = "0.1.0"
