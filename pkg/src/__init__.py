# Almost periodic analysis on half-planes
