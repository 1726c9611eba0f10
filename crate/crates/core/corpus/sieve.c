// Counts the primes below n.
int sieve(int n) {
    int composite[n];
    int count = 0;
    for (int i = 2; i < n; i++) {
        if (composite[i] == 0) {
            count++;
            for (int j = i * i; j < n; j = j + i) {
                composite[j] = 1;
            }
        }
    }
    printf("%d primes below %d\n", count, n);
    return count;
}
