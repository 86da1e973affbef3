"""Metric-name pools for synthetic telemetry.

Each canonical pool only holds names that the bundled taxonomy assigns to
that segment, and each residual pool only names that fall through to the
matching family.  Keep-listed names come first so that planted duplicates
always take names the pruning operator is free to remove.
"""

from __future__ import annotations

from typing import Dict, Tuple

CANONICAL_POOLS: Dict[str, Tuple[str, ...]] = {
    "Cumulative": (
        "processcpusecondstotal",
        "cassandranetworkreceivebytes",
        "jvmthreadsstartedtotal",
        "cassandraCommitLogCompletedTasks",
        "jvmclassesloadedtotal",
        "cassandranetworktransmitbytes",
        "cassandraCompactionCompletedTasks",
        "cassandrareadlatencycount",
        "cassandrawritelatencycount",
        "jvmgccollectionsecondscount",
    ),
    "Latency": (
        "cassandrareadlatency99th",
        "cassandrawritelatency99th",
        "cassandrawritetotallatency",
        "cassandrareadtotallatency",
        "cassandrarangelatency99th",
        "cassandrarangetotallatency",
        "cassandracaslatency99th",
    ),
    "Pressure": (
        "cassandraTablePendingCompactions",
        "cassandraTablePendingFlushes",
        "cassandraCompactionPendingTasks",
        "cassandraColumnFamilyPendingCompactions",
        "cassandraColumnFamilyPendingFlushes",
        "cassandraThreadPoolPendingTasks",
        "cassandraHintsPendingTasks",
    ),
    "Network": (
        "cassandraconnstateestab",
        "cassandraconnstatetimewait",
        "cassandraopensockets",
        "cassandraconnstateclosewait",
        "cassandraconnstatesynrecv",
        "cassandraclientsockets",
        "cassandraconnstatefinwait",
    ),
    "State": (
        "processresidentmemorybytes",
        "jvmbufferpoolusedbytes",
        "cassandraTableLiveDiskSpaceUsed",
        "processvirtualmemorybytes",
        "jvmmemorybytesused",
        "jvmmemorybytescommitted",
        "jvmmemorypoolbytesused",
        "jvmmemorypoolbytescommitted",
        "jvmbufferpoolcapacitybytes",
        "cassandraTableTotalDiskSpaceUsed",
    ),
    "Structural": (
        "cassandraTableLiveSSTableCount",
        "cassandraTableMemtableLiveDataSize",
        "cassandraColumnFamilyLiveSSTableCount",
        "cassandraColumnFamilyMemtableLiveDataSize",
        "cassandraTableMemtableColumnsCount",
        "cassandraColumnFamilyMemtableColumnsCount",
        "cassandraIndexLiveSSTableCount",
    ),
}

RESIDUAL_POOLS: Dict[str, Tuple[str, ...]] = {
    "Ratio & bounded": (
        "cassandraTableBloomFilterFalseRatio",
        "cassandraColumnFamilyBloomFilterFalseRatio",
        "cassandraTableCompressionRatio",
        "cassandraColumnFamilyCompressionRatio",
        "cassandraCacheKeyHitRatio",
        "cassandraCacheRowHitRatio",
        "cassandracounterhitratio",
        "jvmgcpauseratio",
    ),
    "Size & volume": (
        "cassandraTableMeanPartitionSize",
        "cassandraTableMaxPartitionSize",
        "cassandraTableMinPartitionSize",
        "jvmgcallocatedbytestotal",
        "cassandrastreambytesin",
        "cassandrastreambytesout",
        "cassandraTableSnapshotsSizeBytes",
        "cassandraIndexLiveDiskSpaceUsed",
    ),
    "Weak dynamic": (
        "jvmthreadsstatewaiting",
        "jvmthreadsstaterunnable",
        "jvmthreadsstateblocked",
        "jvmthreadsdaemon",
        "jvmthreadscurrent",
        "jvmthreadspeak",
        "cassandraDroppedMessagesMutation",
        "cassandraDroppedMessagesRead",
    ),
    "Monitoring": (
        "scrapedurationseconds",
        "scrapesamplesscraped",
        "scrapeseriesadded",
        "scrapesamplespostmetricrelabeling",
        "telegrafgatherduration",
        "telegrafmetricsgathered",
        "influxdbwritepoints",
        "influxdbwriteerrors",
    ),
}
