# gaussfock - finite-truncation boson Gaussian states: Fock-space engine, Gaussian
# parameters (w, S), rho-integrability and round-trip verification.
