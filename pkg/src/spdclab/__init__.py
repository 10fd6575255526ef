"""spdclab: multi-pair SPDC entanglement experiments end to end.

Subpackages and modules:

* ``qstate``    exact few-photon polarization states, GHZ witness algebra,
                post-selected PBS fusion
* ``witness``   fidelity estimation and Poisson error propagation from
                coincidence counts
* ``hyptest``   distribution-free p-value bound for the bi-separability test
* ``crystal``   refractive indices, walk-off, d_eff and phase matching for
                uniaxial/biaxial crystals
* ``simulator`` Monte Carlo model of the pulsed five-source experiment
* ``cli``       command-line interface (``spdclab`` entry point)
"""

__version__ = "0.1.0"
