#pragma once

#include "sens/query/ast.hpp"
#include "sens/query/evaluator.hpp"
#include "sens/query/lexer.hpp"
#include "sens/query/parser.hpp"
#include "sens/query/printer.hpp"
