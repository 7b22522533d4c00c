#pragma once

#include "noise_lab/boolalg.hpp"
#include "noise_lab/chaos.hpp"
#include "noise_lab/errors.hpp"
#include "noise_lab/geometry.hpp"
#include "noise_lab/interval_set.hpp"
#include "noise_lab/linalg.hpp"
#include "noise_lab/model.hpp"
#include "noise_lab/partition.hpp"
#include "noise_lab/projection_laws.hpp"
#include "noise_lab/rational.hpp"
#include "noise_lab/regopen.hpp"
#include "noise_lab/spectrum.hpp"
#include "noise_lab/harness/chaos_summary.hpp"
#include "noise_lab/harness/config.hpp"
#include "noise_lab/harness/report.hpp"
#include "noise_lab/harness/spectrum_report.hpp"
#include "noise_lab/harness/suite.hpp"
