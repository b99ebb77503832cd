#pragma once

#include "loggas/asymptotics.hpp"
#include "loggas/constants.hpp"
#include "loggas/elliptic.hpp"
#include "loggas/errors.hpp"
#include "loggas/evaluate.hpp"
#include "loggas/numerics.hpp"
#include "loggas/report.hpp"
#include "loggas/result.hpp"
#include "loggas/spectral.hpp"
#include "loggas/theta.hpp"
#include "loggas/verify.hpp"
