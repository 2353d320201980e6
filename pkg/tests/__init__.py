# Tests package for atma
