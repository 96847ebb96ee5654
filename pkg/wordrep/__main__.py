"""The ``wordrep`` console script: ``wordrep VERB ...`` runs management command ``wordrep_VERB``.

Outside a Django project a minimal in-memory configuration is set up first.
"""
import logging
import os
import sys

VERBS = ("check", "word", "orient", "proof", "family", "paper", "convert")


def configure():
    """Set up a standalone configuration with a migrated in-memory database, unless a host project is configured."""
    import django
    from django.conf import settings
    from django.core.management import call_command

    if settings.configured or "DJANGO_SETTINGS_MODULE" in os.environ:
        return
    settings.configure(
        INSTALLED_APPS=["django.contrib.contenttypes", "wordrep"],
        DATABASES={"default": {"ENGINE": "django.db.backends.sqlite3", "NAME": ":memory:"}},
        USE_TZ=True,
        LOGGING_CONFIG=None,
    )
    logging.basicConfig(level=os.environ.get("WORDREP_LOG_LEVEL", "WARNING"))
    django.setup()
    call_command("migrate", verbosity=0, interactive=False)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        sys.stdout.write(f"usage: wordrep {{{','.join(VERBS)}}} ...\n")
        return 0 if argv else 2
    verb, rest = argv[0], argv[1:]
    if verb not in VERBS:
        sys.stderr.write(f"wordrep: unknown command {verb!r}; expected one of {', '.join(VERBS)}\n")
        return 2
    configure()
    from django.core.management import execute_from_command_line

    execute_from_command_line(["wordrep", f"wordrep_{verb}"] + rest)
    return 0


if __name__ == "__main__":
    sys.exit(main())
