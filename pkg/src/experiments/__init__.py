# Experiments Package
