from cyclesim import cli

cli.main_entry()
