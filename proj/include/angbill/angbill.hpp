#pragma once

#include "angbill/error.hpp"
#include "angbill/geometry.hpp"
#include "angbill/jet.hpp"
#include "angbill/roots.hpp"
#include "angbill/polynomial.hpp"
#include "angbill/curve.hpp"
#include "angbill/trace.hpp"
#include "angbill/angular.hpp"
#include "angbill/birkhoff.hpp"
#include "angbill/duality.hpp"
#include "angbill/normal_form.hpp"
#include "angbill/integrability.hpp"
