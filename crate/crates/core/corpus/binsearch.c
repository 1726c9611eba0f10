// Searches the even numbers 0, 2, ..., 2n-2 for `key`; returns its index or -1.
int binsearch(int n, int key) {
    int a[n];
    for (int i = 0; i < n; i++) {
        a[i] = 2 * i;
    }
    int lo = 0;
    int hi = n - 1;
    int found = -1;
    while (lo <= hi && found < 0) {
        int mid = (lo + hi) / 2;
        if (a[mid] == key) {
            found = mid;
        } else if (a[mid] < key) {
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    return found;
}
