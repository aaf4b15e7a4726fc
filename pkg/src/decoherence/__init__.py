# Decoherence Package
