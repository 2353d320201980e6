# Reporters package for atma experiment output
