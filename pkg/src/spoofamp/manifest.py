"""Corpus manifest ingestion in two formats.

asvspoof_protocol: whitespace-separated `speaker_id utterance_id - attack_id
key` lines with key in {bonafide, spoof}; audio paths are resolved as
<audio_root>/<utterance_id> with extension probe order .wav then .flac.

simple_tsv: tab-separated `utterance_id path label attack_id`; relative paths
resolve against the manifest's directory.
"""

import logging
import os
from dataclasses import dataclass

from .errors import ConfigError, DuplicateIdError, ManifestError, MissingInputError

MANIFEST_FORMATS = ("asvspoof_protocol", "simple_tsv")

_log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ManifestEntry:
    """One corpus item: id, resolved audio path, class label, attack id."""

    utterance_id: str
    path: str
    label: str
    attack_id: str


def _resolve_protocol_path(audio_root, utterance_id):
    for ext in (".wav", ".flac"):
        candidate = os.path.join(audio_root, utterance_id + ext)
        if os.path.isfile(candidate):
            return candidate
    # nothing on disk yet; default to the wav name and let the runner report it
    return os.path.join(audio_root, utterance_id + ".wav")


def load_manifest(path, fmt="simple_tsv", audio_root=None):
    """Parse a manifest file into a list of ManifestEntry.

    Raises
    ------
    ConfigError
        Unknown format, or asvspoof_protocol without an audio_root.
    MissingInputError
        Nonexistent manifest path.
    ManifestError
        Malformed line (message cites the line number) or unknown key token.
    DuplicateIdError
        Repeated utterance id (message cites both line numbers).
    """
    if fmt not in MANIFEST_FORMATS:
        raise ConfigError(f"unknown manifest format {fmt!r}; choose from {MANIFEST_FORMATS}")
    if fmt == "asvspoof_protocol" and not audio_root:
        raise ConfigError("asvspoof_protocol manifests need an audio root directory")
    if not os.path.isfile(path):
        raise MissingInputError(f"no such manifest file: {path}")
    entries = []
    seen = {}
    base_dir = os.path.dirname(os.path.abspath(path))
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if fmt == "asvspoof_protocol":
                tokens = line.split()
                if len(tokens) != 5:
                    raise ManifestError(
                        f"{path}:{lineno}: expected 5 whitespace-separated fields "
                        f"(speaker utterance - attack key), got {len(tokens)}"
                    )
                _speaker, utt, _unused, attack, key = tokens
                if key not in ("bonafide", "spoof"):
                    raise ManifestError(
                        f"{path}:{lineno}: unknown key token {key!r} "
                        "(expected 'bonafide' or 'spoof')"
                    )
                entry = ManifestEntry(
                    utterance_id=utt,
                    path=_resolve_protocol_path(audio_root, utt),
                    label=key,
                    attack_id=attack,
                )
            else:
                tokens = line.split("\t")
                if len(tokens) != 4:
                    raise ManifestError(
                        f"{path}:{lineno}: expected 4 tab-separated fields "
                        f"(utterance_id path label attack_id), got {len(tokens)}"
                    )
                utt, audio_path, label, attack = tokens
                if label not in ("bonafide", "spoof"):
                    raise ManifestError(
                        f"{path}:{lineno}: unknown label {label!r} "
                        "(expected 'bonafide' or 'spoof')"
                    )
                if not os.path.isabs(audio_path):
                    audio_path = os.path.join(base_dir, audio_path)
                entry = ManifestEntry(
                    utterance_id=utt, path=audio_path, label=label, attack_id=attack
                )
            if entry.utterance_id in seen:
                raise DuplicateIdError(
                    f"{path}: duplicate utterance id {entry.utterance_id!r} "
                    f"on lines {seen[entry.utterance_id]} and {lineno}"
                )
            seen[entry.utterance_id] = lineno
            entries.append(entry)
    if not entries:
        _log.warning("manifest %s is empty", path)
    return entries


def write_manifest(path, entries):
    """Write entries in simple_tsv format; paths inside the manifest's own
    directory are stored relative to it."""
    base_dir = os.path.dirname(os.path.abspath(path))
    with open(path, "w", encoding="utf-8") as f:
        for e in entries:
            p = e.path
            if os.path.isabs(p):
                try:
                    rel = os.path.relpath(p, base_dir)
                except ValueError:
                    rel = p
                if not rel.startswith(".."):
                    p = rel
            f.write(f"{e.utterance_id}\t{p}\t{e.label}\t{e.attack_id}\n")
