"""Standalone sidecars that emit canonical single-layer feature JSON.

Each module wraps one pretrained model behind the sidecar protocol:
`sidecar-<layer> <wav-path> [--stub]` prints a schema_version-1 feature
document on standard output, `--manifest` prints the sidecar's identity.
The package shares no code with the consumer; the JSON contract is the
entire interface.
"""

__version__ = "0.1.0"
