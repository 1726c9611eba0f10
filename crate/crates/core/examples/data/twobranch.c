int classify(int x) {
    if (x - 10 > 30) {
        return 1;
    } else {
        return 0;
    }
}
