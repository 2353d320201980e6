# Configuration package: packaged defaults and experiment file loader
