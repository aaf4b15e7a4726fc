# Walk Package
