from .settings import settings, Settings, LogLevel

__all__ = ["settings", "Settings", "LogLevel"]
