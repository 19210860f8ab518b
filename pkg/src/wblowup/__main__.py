from .iface.cli import entry

entry()
