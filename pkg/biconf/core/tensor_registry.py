"""Registry of obstruction tensors addressable by id."""

from biconf.core.errors import UnknownTensor
from biconf.core.logging import get_logger
from biconf.core.types import ObstructionTensor, TensorRegistry

logger = get_logger(__name__)


class TensorRegistryImpl(TensorRegistry):
    """Implementation of the tensor registry."""

    def __init__(self):
        self._tensors: dict[str, ObstructionTensor] = {}
        self._aliases: dict[str, str] = {}

    def register(self, tensor: ObstructionTensor) -> None:
        """Register a tensor and its aliases."""
        self._tensors[tensor.id] = tensor
        for alias in tensor.aliases:
            self._aliases[alias] = tensor.id
        logger.debug(f"Registered tensor: {tensor.id}")

    def get_tensor(self, name: str) -> ObstructionTensor | None:
        """Get a tensor by id or alias."""
        return self._tensors.get(self._aliases.get(name, name))

    def require(self, name: str) -> ObstructionTensor:
        """Get a tensor or raise UnknownTensor."""
        tensor = self.get_tensor(name)
        if tensor is None:
            known = ", ".join(sorted(self._tensors))
            raise UnknownTensor(f"unknown tensor '{name}' (known: {known})")
        return tensor

    def list_tensors(self) -> list[ObstructionTensor]:
        """List all registered tensors in registration order."""
        return list(self._tensors.values())

    def unregister(self, name: str) -> None:
        """Unregister a tensor by id."""
        if name in self._tensors:
            del self._tensors[name]
            self._aliases = {a: t for a, t in self._aliases.items() if t != name}
            logger.info(f"Unregistered tensor: {name}")

    def clear(self) -> None:
        """Clear all registered tensors."""
        self._tensors.clear()
        self._aliases.clear()
        logger.info("Cleared all registered tensors")


# Global registry instance
registry = TensorRegistryImpl()


def get_registry() -> TensorRegistryImpl:
    """Get the global tensor registry."""
    return registry
