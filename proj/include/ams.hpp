#pragma once

#include <ams/analytic.hpp>
#include <ams/catalog.hpp>
#include <ams/config.hpp>
#include <ams/engine.hpp>
#include <ams/error.hpp>
#include <ams/estimators.hpp>
#include <ams/experiments.hpp>
#include <ams/models.hpp>
#include <ams/rng.hpp>
#include <ams/score.hpp>
#include <ams/sde.hpp>
