#pragma once

#include "h4/code_table.hpp"
#include "h4/code_tree.hpp"
#include "h4/direction.hpp"
#include "h4/frequency_table.hpp"
#include "h4/huffman.hpp"
#include "h4/symbol.hpp"
