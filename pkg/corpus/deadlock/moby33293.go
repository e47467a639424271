// Real-world: moby#33293. The event monitor publishes two events and a
// quit signal, but the subscriber reads only one event before waiting on
// the quit channel.
// Expected: deadlock
package main

import "fmt"

func monitor(events chan int, quit chan bool) {
	events <- 1
	events <- 2
	quit <- true
}

func main() {
	events := make(chan int)
	quit := make(chan bool)
	go monitor(events, quit)
	fmt.Println(<-events)
	<-quit
}
