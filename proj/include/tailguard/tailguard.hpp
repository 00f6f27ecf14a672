#pragma once

// Convenience umbrella for the whole library.

#include "tailguard/classify/classifier.hpp"
#include "tailguard/classify/normalize.hpp"
#include "tailguard/classify/taxonomy.hpp"
#include "tailguard/core/model.hpp"
#include "tailguard/core/validate.hpp"
#include "tailguard/detect/line_scan.hpp"
#include "tailguard/detect/rules.hpp"
#include "tailguard/detect/scanner.hpp"
#include "tailguard/diff/file_kind.hpp"
#include "tailguard/diff/manifest_scripts.hpp"
#include "tailguard/diff/unified_diff.hpp"
#include "tailguard/ingest/corpus_io.hpp"
#include "tailguard/ingest/forge_client.hpp"
#include "tailguard/report/bundle.hpp"
#include "tailguard/report/emit.hpp"
#include "tailguard/stats/aggregate.hpp"
#include "tailguard/stats/tiers.hpp"
#include "tailguard/version.hpp"
