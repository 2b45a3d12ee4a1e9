#pragma once

#include "glassdescent/analysis.hpp"
#include "glassdescent/descent.hpp"
#include "glassdescent/error.hpp"
#include "glassdescent/harness.hpp"
#include "glassdescent/instance_io.hpp"
#include "glassdescent/oracle.hpp"
#include "glassdescent/parallel.hpp"
#include "glassdescent/report.hpp"
#include "glassdescent/rng.hpp"
#include "glassdescent/sk_model.hpp"
