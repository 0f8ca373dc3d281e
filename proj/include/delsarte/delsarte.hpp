// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "delsarte/core.hpp"
#include "delsarte/grid.hpp"
#include "delsarte/stencil.hpp"
#include "delsarte/expr.hpp"
#include "delsarte/coeff.hpp"
#include "delsarte/diffop.hpp"
#include "delsarte/quadrature.hpp"
#include "delsarte/concomitant.hpp"
#include "delsarte/family.hpp"
#include "delsarte/transmutation.hpp"
#include "delsarte/forms.hpp"
#include "delsarte/io.hpp"
#include "delsarte/report.hpp"
#include "delsarte/scenarios.hpp"
