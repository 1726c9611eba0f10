int clamp(int lo, int hi, int v) {
    int seen[3];
    if (v < lo) {
        seen[0] = v;
        return lo;
    }
    if (v > hi && lo <= hi) {
        seen[1] = seen[0] + v;
        return hi;
    }
    seen[2] = v;
    return v;
}
