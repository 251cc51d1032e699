"""Enable execution with python -m asrefine."""

from .batch_cli import register_batch
from .cli import main
from .fixture_cli import register_fixture
from .mutate_cli import register_mutate

# Register subcommands
register_batch(main)
register_mutate(main)
register_fixture(main)

if __name__ == "__main__":
    main()
