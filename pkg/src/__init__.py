"""Heat-flux boundary value problem: shooting solver and verifier."""
