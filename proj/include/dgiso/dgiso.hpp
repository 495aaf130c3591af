#pragma once

#include "dgiso/density.hpp"
#include "dgiso/line.hpp"
#include "dgiso/oracle.hpp"
#include "dgiso/plane.hpp"
#include "dgiso/quadrature.hpp"
#include "dgiso/report.hpp"
#include "dgiso/roots.hpp"
#include "dgiso/run.hpp"
#include "dgiso/stationary.hpp"
