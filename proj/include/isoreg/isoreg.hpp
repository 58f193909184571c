#pragma once

#include "isoreg/core.hpp"
#include "isoreg/dag.hpp"
#include "isoreg/error.hpp"
#include "isoreg/fast_linear.hpp"
#include "isoreg/flow.hpp"
#include "isoreg/io.hpp"
#include "isoreg/oracle.hpp"
#include "isoreg/order.hpp"
#include "isoreg/regress.hpp"
#include "isoreg/regress_l0.hpp"
#include "isoreg/regress_partition.hpp"
#include "isoreg/violator.hpp"
