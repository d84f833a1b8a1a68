"""
Subcommands of the command-line interface, one module per subcommand
"""

from commands.avqfi import cmd_avqfi
from commands.band import cmd_band
from commands.qfi import cmd_qfi
from commands.sample import cmd_sample
from commands.sweep import cmd_sweep
from commands.verify import cmd_verify

__all__ = ['cmd_avqfi', 'cmd_band', 'cmd_qfi', 'cmd_sample', 'cmd_sweep', 'cmd_verify']
