# Sample inputs: coefficient sequences, spectral measures and compact sets
