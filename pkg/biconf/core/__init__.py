"""Core framework components: config, logging, errors and the tensor registry."""
