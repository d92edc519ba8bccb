"""Manifest parsing for both supported formats."""

import logging
import os

import pytest

from spoofamp.errors import ConfigError, DuplicateIdError, ManifestError, MissingInputError
from spoofamp.manifest import ManifestEntry, load_manifest, write_manifest


class TestProtocolFormat:
    def test_basic_line(self, tmp_path):
        p = tmp_path / "protocol.txt"
        p.write_text(
            "LA_0079 LA_T_1138215 - - bonafide\n"
            "LA_0079 LA_T_1271820 - A01 spoof\n"
        )
        entries = load_manifest(str(p), fmt="asvspoof_protocol", audio_root=str(tmp_path))
        assert entries[0] == ManifestEntry(
            utterance_id="LA_T_1138215",
            path=str(tmp_path / "LA_T_1138215.wav"),
            label="bonafide",
            attack_id="-",
        )
        assert entries[1].label == "spoof"
        assert entries[1].attack_id == "A01"

    def test_wav_preferred_over_flac(self, tmp_path):
        (tmp_path / "U1.wav").write_bytes(b"")
        (tmp_path / "U1.flac").write_bytes(b"")
        (tmp_path / "U2.flac").write_bytes(b"")
        p = tmp_path / "protocol.txt"
        p.write_text("S U1 - - bonafide\nS U2 - A01 spoof\n")
        entries = load_manifest(str(p), fmt="asvspoof_protocol", audio_root=str(tmp_path))
        assert entries[0].path.endswith("U1.wav")
        assert entries[1].path.endswith("U2.flac")

    def test_missing_audio_defaults_to_wav_name(self, tmp_path):
        p = tmp_path / "protocol.txt"
        p.write_text("S U9 - - bonafide\n")
        entries = load_manifest(str(p), fmt="asvspoof_protocol", audio_root=str(tmp_path))
        assert entries[0].path.endswith("U9.wav")

    def test_audio_root_required(self, tmp_path):
        p = tmp_path / "protocol.txt"
        p.write_text("S U1 - - bonafide\n")
        with pytest.raises(ConfigError):
            load_manifest(str(p), fmt="asvspoof_protocol")

    def test_wrong_field_count_cites_line(self, tmp_path):
        p = tmp_path / "protocol.txt"
        p.write_text("S U1 - - bonafide\nS U2 spoof\n")
        with pytest.raises(ManifestError, match=":2:"):
            load_manifest(str(p), fmt="asvspoof_protocol", audio_root=str(tmp_path))

    def test_unknown_key_token(self, tmp_path):
        p = tmp_path / "protocol.txt"
        p.write_text("S U1 - - genuine\n")
        with pytest.raises(ManifestError, match="genuine"):
            load_manifest(str(p), fmt="asvspoof_protocol", audio_root=str(tmp_path))


class TestTsvFormat:
    def test_basic_line(self, tmp_path):
        p = tmp_path / "manifest.tsv"
        p.write_text("U1\t/abs/u1.wav\tbonafide\t-\n")
        entries = load_manifest(str(p))
        assert entries == [ManifestEntry("U1", "/abs/u1.wav", "bonafide", "-")]

    def test_relative_path_resolves_against_manifest_dir(self, tmp_path):
        sub = tmp_path / "corpus"
        sub.mkdir()
        p = sub / "manifest.tsv"
        p.write_text("U1\taudio/u1.wav\tspoof\tA02\n")
        entries = load_manifest(str(p))
        assert entries[0].path == str(sub / "audio" / "u1.wav")

    def test_wrong_field_count(self, tmp_path):
        p = tmp_path / "manifest.tsv"
        p.write_text("U1\tu1.wav\tbonafide\n")
        with pytest.raises(ManifestError, match=":1:"):
            load_manifest(str(p))

    def test_space_separated_rejected(self, tmp_path):
        p = tmp_path / "manifest.tsv"
        p.write_text("U1 u1.wav bonafide -\n")
        with pytest.raises(ManifestError):
            load_manifest(str(p))

    def test_unknown_label(self, tmp_path):
        p = tmp_path / "manifest.tsv"
        p.write_text("U1\tu1.wav\tgenuine\t-\n")
        with pytest.raises(ManifestError, match="genuine"):
            load_manifest(str(p))


class TestSharedBehavior:
    def test_unknown_format(self, tmp_path):
        with pytest.raises(ConfigError):
            load_manifest(str(tmp_path / "x"), fmt="csv")

    def test_missing_manifest_file(self, tmp_path):
        with pytest.raises(MissingInputError, match="no such manifest file"):
            load_manifest(str(tmp_path / "nope.tsv"))

    def test_duplicate_id_cites_both_lines(self, tmp_path):
        p = tmp_path / "manifest.tsv"
        p.write_text(
            "U1\ta.wav\tbonafide\t-\n"
            "U2\tb.wav\tspoof\tA01\n"
            "U1\tc.wav\tspoof\tA01\n"
        )
        with pytest.raises(DuplicateIdError, match=r"lines 1 and 3"):
            load_manifest(str(p))

    def test_blank_lines_skipped(self, tmp_path):
        p = tmp_path / "manifest.tsv"
        p.write_text("\nU1\ta.wav\tbonafide\t-\n\n")
        assert len(load_manifest(str(p))) == 1

    def test_empty_manifest_warns_but_succeeds(self, tmp_path, caplog):
        p = tmp_path / "manifest.tsv"
        p.write_text("")
        with caplog.at_level(logging.WARNING, logger="spoofamp.manifest"):
            entries = load_manifest(str(p))
        assert entries == []
        assert any("empty" in r.message for r in caplog.records)


class TestWriteManifest:
    def test_roundtrip_with_relative_storage(self, tmp_path):
        audio = tmp_path / "audio"
        audio.mkdir()
        entries = [
            ManifestEntry("U1", str(audio / "u1.wav"), "bonafide", "-"),
            ManifestEntry("U2", "/elsewhere/u2.wav", "spoof", "A01"),
        ]
        p = tmp_path / "manifest.tsv"
        write_manifest(str(p), entries)
        text = p.read_text()
        assert os.path.join("audio", "u1.wav") + "\t" in text  # stored relative
        assert "/elsewhere/u2.wav" in text  # outside paths stay absolute
        assert load_manifest(str(p)) == entries
