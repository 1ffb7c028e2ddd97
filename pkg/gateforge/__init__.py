# This file makes gateforge a package.
