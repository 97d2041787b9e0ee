from dotenv import load_dotenv

from application.settings import load_settings
from interfaces.cli.commands import create_cli


load_dotenv()


def main() -> None:
    cli = create_cli(load_settings())
    cli(prog_name="qaccord")


if __name__ == "__main__":
    main()
