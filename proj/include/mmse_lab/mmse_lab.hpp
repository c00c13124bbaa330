#pragma once

// Everything except JSON I/O (mmse_lab/json_io.hpp), which pulls in nlohmann/json.

#include "mmse_lab/analysis.hpp"
#include "mmse_lab/calculus.hpp"
#include "mmse_lab/capacity.hpp"
#include "mmse_lab/channel.hpp"
#include "mmse_lab/distributions.hpp"
#include "mmse_lab/errors.hpp"
#include "mmse_lab/infotheory.hpp"
#include "mmse_lab/mmse.hpp"
#include "mmse_lab/oracle.hpp"
#include "mmse_lab/parallel.hpp"
#include "mmse_lab/quadrature.hpp"
