// Kahn's algorithm on a DAG over n nodes: edge i -> j when j = i + 1 or
// j = 2i + 1. Returns how many nodes were ordered.
int topo(int n) {
    int adj[n * n];
    int indeg[n];
    int queue[n];
    for (int i = 0; i < n; i++) {
        if (i + 1 < n) {
            adj[i * n + i + 1] = 1;
            indeg[i + 1] += 1;
        }
        if (2 * i + 1 < n && 2 * i + 1 != i + 1) {
            adj[i * n + 2 * i + 1] = 1;
            indeg[2 * i + 1] += 1;
        }
    }
    int head = 0;
    int tail = 0;
    for (int i = 0; i < n; i++) {
        if (indeg[i] == 0) {
            queue[tail] = i;
            tail++;
        }
    }
    while (head < tail) {
        int u = queue[head];
        head++;
        for (int v = 0; v < n; v++) {
            if (adj[u * n + v] == 1) {
                indeg[v] -= 1;
                if (indeg[v] == 0) {
                    queue[tail] = v;
                    tail++;
                }
            }
        }
    }
    return tail;
}
