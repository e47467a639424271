// Pattern P6 (main-exit): the main function finishes before the spawned
// goroutine completes; the runtime kills it.
// Expected: no deadlock
package main

import "fmt"
import "time"

func slow() {
	time.Sleep(1000)
	fmt.Println("finished late")
}

func main() {
	go slow()
	fmt.Println("main done")
}
