/** Shared test-server coordinates (the global setup spawns it here). */
export const SERVER_PORT = 8791;
export const BASE_URL = `http://127.0.0.1:${SERVER_PORT}`;
