#pragma once

#include "bench.hpp"
#include "cli.hpp"
#include "default_kb.hpp"
#include "emitters.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "intent_graph.hpp"
#include "knowledge_base.hpp"
#include "layout_resolver.hpp"
#include "netlist.hpp"
#include "spec_ingest.hpp"
#include "structurer.hpp"
#include "structurer_external.hpp"
#include "verify.hpp"
