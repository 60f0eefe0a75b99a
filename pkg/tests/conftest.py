from jax import config
from jaxtyping import install_import_hook

config.update("jax_enable_x64", True)

# import rijax within import hook to apply beartype everywhere, before running tests
with install_import_hook("rijax", "beartype.beartype"):
    import rijax  # noqa: F401
