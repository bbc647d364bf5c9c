"Opening and naming of artifact files"

import io
import os
import gzip
import bz2
import lzma

OUTPUT_DIR_VARIABLE = 'PYSUPNORM_OUTPUT_DIR'
COMPRESSED_SUFFIXES = ('.gz', '.bz2', '.xz', '.lzma')


def open_artifact(filename, mode='r'):
    """
    Opens plain or compressed files alike, choosing the codec by suffix.
    Text mode is the default, as with open(). Parent directories are created
    when writing.

    :param filename: path, optionally ending in .gz, .bz2 or .xz
    :param mode: file mode
    """
    filename = os.fspath(filename)
    if 't' not in mode and 'b' not in mode:
        mode = mode + 't'
    if any(c in mode for c in 'wax'):
        parent = os.path.dirname(filename)
        if parent:
            os.makedirs(parent, exist_ok=True)
    # no timestamp in the gzip header: repeated runs stay byte-identical
    if filename.endswith('.gz'):
        if 'r' in mode:
            return gzip.open(filename, mode)
        binary = mode.replace('t', '').replace('b', '') + 'b'
        raw = gzip.GzipFile(filename, binary, compresslevel=5, mtime=0)
        return raw if 'b' in mode else _text(raw)
    elif filename.endswith('.bz2'):
        return bz2.open(filename, mode)
    elif filename.endswith('.xz') or filename.endswith('.lzma'):
        return lzma.open(filename, mode)
    else:
        return open(filename, mode)


def _text(raw):
    return io.TextIOWrapper(raw, encoding='utf8', newline='')


def strip_compression(filename):
    "Filename without its compression suffix"
    for suffix in COMPRESSED_SUFFIXES:
        if filename.endswith(suffix):
            return filename[:-len(suffix)]
    return filename


def artifact_path(command, fmt, output=None, environ=None):
    """
    Where a command writes its report: `output` if given, otherwise
    <command>.<fmt> in $PYSUPNORM_OUTPUT_DIR (or the working directory)

    :rtype: str
    """
    if output:
        return output
    environ = os.environ if environ is None else environ
    directory = environ.get(OUTPUT_DIR_VARIABLE) or os.getcwd()
    return os.path.join(directory, '{}.{}'.format(command, fmt))
