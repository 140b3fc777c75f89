#pragma once

#include "builder.hpp"
#include "crowns.hpp"
#include "expr.hpp"
#include "finite_group.hpp"
#include "genset.hpp"
#include "perm_group.hpp"
#include "report.hpp"
#include "structure.hpp"
#include "verify.hpp"
