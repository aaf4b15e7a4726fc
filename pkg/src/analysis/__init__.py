# Analysis Package
