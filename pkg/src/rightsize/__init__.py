"""Online right-sizing of heterogeneous data centers."""
