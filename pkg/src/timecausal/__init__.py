"""Time-causal and time-recursive spatio-temporal scale-space."""
