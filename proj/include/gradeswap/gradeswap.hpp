#pragma once

#include "gradeswap/assessment.hpp"
#include "gradeswap/curve.hpp"
#include "gradeswap/errors.hpp"
#include "gradeswap/gradebook.hpp"
#include "gradeswap/grades.hpp"
#include "gradeswap/ledger.hpp"
#include "gradeswap/licenses.hpp"
#include "gradeswap/order_book.hpp"
#include "gradeswap/result.hpp"
#include "gradeswap/scenario.hpp"
#include "gradeswap/score_sheet.hpp"
#include "gradeswap/simulation.hpp"
#include "gradeswap/swap_engine.hpp"
#include "gradeswap/valuation.hpp"
