# Classical Walk Package
