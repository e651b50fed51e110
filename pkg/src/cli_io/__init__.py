from src.cli_io.commands import COMMANDS
from src.cli_io.formats import load_agler, load_signal, load_system, save_system, system_from_dict, system_to_dict
from src.cli_io.reports import SCHEMA_VERSION, RunReport
