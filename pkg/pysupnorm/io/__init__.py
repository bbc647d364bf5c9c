from pysupnorm.io.base import open_artifact, artifact_path
from pysupnorm.io.formats import (read_qseries, write_qseries, read_jacobi,
                                  write_jacobi)
from pysupnorm.io.reports import (write_reports, read_reports, write_table,
                                  read_table, reports_frame)
