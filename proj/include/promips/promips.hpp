#pragma once

#include "promips/bench.hpp"
#include "promips/chi_square.hpp"
#include "promips/conditions.hpp"
#include "promips/core.hpp"
#include "promips/dataset_io.hpp"
#include "promips/errors.hpp"
#include "promips/idistance.hpp"
#include "promips/kmeans.hpp"
#include "promips/metrics.hpp"
#include "promips/page_store.hpp"
#include "promips/projection.hpp"
#include "promips/quick_probe.hpp"
#include "promips/search.hpp"
#include "promips/synthetic.hpp"
