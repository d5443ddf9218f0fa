#pragma once

#include "fairex/correlation.hpp"
#include "fairex/data.hpp"
#include "fairex/errors.hpp"
#include "fairex/examination.hpp"
#include "fairex/experiments.hpp"
#include "fairex/fairness_metrics.hpp"
#include "fairex/fmt.hpp"
#include "fairex/ids.hpp"
#include "fairex/io.hpp"
#include "fairex/joint_metrics.hpp"
#include "fairex/measures.hpp"
#include "fairex/preprocess.hpp"
#include "fairex/relevance_metrics.hpp"
#include "fairex/report.hpp"
#include "fairex/rerank.hpp"
#include "fairex/rng.hpp"
