#pragma once

#include "pixhom/errors.hpp"
#include "pixhom/fem.hpp"
#include "pixhom/geometry.hpp"
#include "pixhom/homogenization.hpp"
#include "pixhom/material.hpp"
#include "pixhom/report.hpp"
#include "pixhom/verify.hpp"
#include "pixhom/vigdergauz.hpp"
