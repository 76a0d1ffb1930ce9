//! Benchmarks for `dgrp`; see `benches/`.
