#pragma once

// Umbrella header.

#include "pkt/alt.hpp"
#include "pkt/chart.hpp"
#include "pkt/checks.hpp"
#include "pkt/contraconn.hpp"
#include "pkt/errors.hpp"
#include "pkt/expr.hpp"
#include "pkt/fields.hpp"
#include "pkt/fixtures.hpp"
#include "pkt/frame.hpp"
#include "pkt/jet.hpp"
#include "pkt/liealg.hpp"
#include "pkt/report.hpp"
#include "pkt/runner.hpp"
#include "pkt/specio.hpp"
