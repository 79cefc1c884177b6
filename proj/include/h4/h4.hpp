#pragma once

// Everything except the WebSocket server (h4/gateway/server.hpp), which pulls in Boost.

#include "h4/codec.hpp"
#include "h4/config.hpp"
#include "h4/engine.hpp"
#include "h4/experiment/anova.hpp"
#include "h4/experiment/learning_curve.hpp"
#include "h4/experiment/phrase_set.hpp"
#include "h4/experiment/report.hpp"
#include "h4/experiment/schedule.hpp"
#include "h4/experiment/session_store.hpp"
#include "h4/experiment/simulate.hpp"
#include "h4/experiment/summary.hpp"
#include "h4/gateway/session.hpp"
#include "h4/keystroke_log.hpp"
#include "h4/metrics.hpp"
