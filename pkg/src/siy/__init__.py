# Sigma-I-Y Sampler Package
