# reprosamples/command/factory.py
from typing import Dict, List

from reprosamples.command.base import CommandHandler
from reprosamples.command.coef import CoefCommand
from reprosamples.command.model_cs import ModelCsCommand
from reprosamples.command.search import SearchCommand
from reprosamples.command.simulate import SimulateCommand
from reprosamples.utils.errors import InvalidConfig


class CommandFactory:
    """Factory for registering and retrieving subcommands"""

    _commands: Dict[str, CommandHandler] = {}

    @classmethod
    def register_command(cls, command: CommandHandler) -> None:
        """
        Register a subcommand under its name

        Args:
            command: the handler instance
        """
        cls._commands[command.name] = command

    @classmethod
    def get_command(cls, name: str) -> CommandHandler:
        if not cls._commands:
            cls.initialize_default_commands()
        try:
            return cls._commands[name]
        except KeyError:
            raise InvalidConfig(f"unknown command {name!r}; choose from {', '.join(cls.names())}") from None

    @classmethod
    def names(cls) -> List[str]:
        if not cls._commands:
            cls.initialize_default_commands()
        return list(cls._commands)

    @classmethod
    def initialize_default_commands(cls) -> None:
        """Register search, model-cs, coef and simulate"""
        cls.register_command(SearchCommand())
        cls.register_command(ModelCsCommand())
        cls.register_command(CoefCommand())
        cls.register_command(SimulateCommand())
