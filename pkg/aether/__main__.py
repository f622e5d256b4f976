from aether.cli.main import app

app(prog_name="aether")
