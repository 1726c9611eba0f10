// Greedy change for `amount`, plus an exhaustive count of the ways to pay it
// with ones and twos. Long paths, almost no array traffic.
int change(int amount) {
    int coin[7];
    coin[0] = 100;
    coin[1] = 50;
    coin[2] = 20;
    coin[3] = 10;
    coin[4] = 5;
    coin[5] = 2;
    coin[6] = 1;
    int rest = amount;
    int greedy = 0;
    for (int k = 0; k < 7; k++) {
        int c = coin[k];
        while (rest >= c) {
            rest = rest - c;
            greedy++;
        }
    }
    int ways = 0;
    for (int ones = 0; ones <= amount; ones++) {
        for (int twos = 0; ones + 2 * twos <= amount; twos++) {
            if (ones + 2 * twos == amount) {
                ways++;
            }
        }
    }
    return ways * 1000 + greedy;
}
