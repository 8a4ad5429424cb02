namespace tenttile {}
