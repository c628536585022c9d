// servepred.hpp - umbrella header
#pragma once

#include "servepred/court_geometry.hpp"
#include "servepred/csv.hpp"
#include "servepred/errors.hpp"
#include "servepred/features.hpp"
#include "servepred/mcp_data.hpp"
#include "servepred/models/model.hpp"
#include "servepred/notation.hpp"
#include "servepred/pipeline.hpp"
#include "servepred/reports.hpp"
#include "servepred/rng.hpp"
#include "servepred/score_engine.hpp"
